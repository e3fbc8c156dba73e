package shop;

public class Customers {
    public Customer resolve(String customerId, String region) {
        Customer customer = null;
        customer = registry.lookup(customerId);
        if (customer == null)
            throw new NoSuchElementException(customerId);
        return customer;
    }

    public void rename(Customer customer, String name) {
        String previous = customer.name();
        customer.setName(name.trim());
        registry.update(customer);
        history.renamed(customer.id(), previous, name);
    }

    public Customer transfer(String customerId, String region) {
        Customer customer = registry.lookup(customerId, region);
        customer = registry.lookup(customerId, region);
        customer.setRegion(region);
        registry.update(customer);
        return customer;
    }

    public int loyaltyPoints(Customer customer) {
        int points = 0;
        for (Order o : orders.byCustomer(customer.id()))
            points += o.itemCount() * pointsPerItem;
        return points;
    }

    public void deactivate(Customer customer) {
        customer.setActive(false);
        sessions.invalidate(customer.id());
        registry.update(customer);
        log.info("invoice sent " + invoice.number());
        notifier.accountClosed(customer);
    }
}
